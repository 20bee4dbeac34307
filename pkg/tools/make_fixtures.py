#!/usr/bin/env python3
"""Regenerate the checked-in fixture DDP trees and HAR captures.

The trees mimic Dec-2024 exports from the three platforms but every value
is synthetic. Layouts are reconstructions, not ground truth; when a real
export drifts, update the manifest data files and these fixtures together.

Run from the repo root:  python tools/make_fixtures.py
"""

from __future__ import annotations

import json
import shutil
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def utc(y, mo, d, h=0, mi=0, s=0) -> int:
    return int(datetime(y, mo, d, h, mi, s, tzinfo=timezone.utc).timestamp())


def iso(y, mo, d, h=0, mi=0, s=0) -> str:
    return datetime(y, mo, d, h, mi, s, tzinfo=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def stamp(y, mo, d, h=0, mi=0, s=0) -> str:
    return datetime(y, mo, d, h, mi, s).strftime("%Y-%m-%d %H:%M:%S")


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def write_json(path: Path, doc) -> None:
    write(path, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def blocks(rows: list[dict[str, str]]) -> str:
    return "\n\n".join("\n".join(f"{k}: {v}" for k, v in row.items()) for row in rows) + "\n"


def sm(pairs: dict) -> dict:
    """Meta-style string_map_data cell."""
    out = {}
    for key, value in pairs.items():
        if isinstance(value, int):
            out[key] = {"timestamp": value}
        elif isinstance(value, tuple):  # (href, timestamp)
            out[key] = {"href": value[0], "timestamp": value[1]}
        else:
            out[key] = {"value": value}
    return {"string_map_data": out}


# ---------------------------------------------------------------- tiktok

def make_tiktok(base: Path) -> None:
    vid = "https://www.tiktokv.com/share/video/72000000000000{:04d}/"
    # watch history spans ~180 days (six-month retention)
    write(base / "Activity/Video Browsing History.txt", blocks([
        {"Date": stamp(2024, 6, 23, 14, 0, 0), "Link": vid.format(1)},
        {"Date": stamp(2024, 8, 2, 9, 15, 30), "Link": vid.format(2)},
        {"Date": stamp(2024, 10, 11, 20, 5, 1), "Link": vid.format(3)},
        {"Date": stamp(2024, 12, 1, 7, 45, 22), "Link": vid.format(4)},
        {"Date": stamp(2024, 12, 20, 15, 30, 0), "Link": vid.format(5)},
    ]))
    write(base / "Activity/Like List.txt", blocks([
        {"Date": stamp(2024, 9, 14, 11, 2, 3), "Link": vid.format(2)},
        {"Date": stamp(2024, 11, 5, 18, 30, 0), "Link": vid.format(3)},
        {"Date": stamp(2024, 12, 19, 22, 10, 45), "Link": vid.format(5)},
    ]))
    write(base / "Activity/Search History.txt", blocks([
        {"Date": stamp(2024, 7, 1, 10, 0, 0), "Search Term": "pasta recipe"},
        {"Date": stamp(2024, 10, 30, 16, 40, 12), "Search Term": "berlin marathon"},
        {"Date": stamp(2024, 12, 18, 8, 5, 9), "Search Term": "lofi mix"},
    ]))
    write(base / "Activity/Favorite Videos.txt", blocks([
        {"Date": stamp(2024, 8, 20, 12, 0, 0), "Link": vid.format(1)},
        {"Date": stamp(2024, 12, 10, 19, 25, 0), "Link": vid.format(4)},
    ]))
    write(base / "Activity/Share History.txt", blocks([
        {"Date": stamp(2024, 9, 2, 13, 14, 15), "Link": vid.format(2), "Method": "chat"},
        {"Date": stamp(2024, 11, 23, 21, 0, 59), "Link": vid.format(3), "Method": "copy_link"},
    ]))
    write(base / "Direct Messages/Chat History.txt", blocks([
        {"Date": stamp(2024, 10, 2, 9, 0, 0), "From": "friend_alpha", "Content": "check this sound"},
        {"Date": stamp(2024, 12, 5, 17, 33, 20), "From": "fixture_user", "Content": "on my way"},
    ]))
    write(base / "Activity/Interests.txt", blocks([
        {"Topic": "Cooking"},
        {"Topic": "Running"},
    ]))
    write(base / "Content/Posted Videos.txt", blocks([
        {
            "Date": stamp(2024, 11, 11, 11, 11, 11),
            "Link": "https://www.tiktokv.com/content/post/001.mp4",
            "Caption": "sunset run",
            "Location": "Tiergarten, Berlin",
        },
    ]))
    write(base / "Profile/Profile Information.txt", blocks([
        {
            "Username": "fixture_user",
            "Birthdate": "1990-01-01",
            "Email": "fixture.user@example.com",
            "Profile Photo": "https://p16.tiktokcdn-eu.example/profile/photo.jpeg",
        },
    ]))
    write(base / "Activity/Follower List.txt", blocks([
        {"Date": stamp(2024, 7, 7, 7, 7, 7), "Username": "friend_alpha"},
        {"Date": stamp(2024, 12, 2, 10, 10, 10), "Username": "friend_beta"},
    ]))
    write(base / "Activity/Login History.txt", blocks([
        {
            "Date": stamp(2024, 12, 19, 6, 50, 0),
            "IP Address": "203.0.113.7",
            "Device Model": "Pixel 6",
            "Device System": "Android 14",
            "Network Type": "Wi-Fi",
            "Carrier": "FixtureCell",
        },
        {
            "Date": stamp(2024, 12, 20, 8, 1, 2),
            "IP Address": "203.0.113.9",
            "Device Model": "Pixel 6",
            "Device System": "Android 14",
            "Network Type": "4G",
            "Carrier": "FixtureCell",
        },
    ]))
    write(base / "App Settings/Devices.txt", blocks([
        {"User Agent": "com.zhiliaoapp.musically/2024120 (Linux; Android 14; Pixel 6)"},
    ]))
    write(base / "Profile/Most Recent Location Data.txt", blocks([
        {"Place": "Berlin", "Latitude": "52.52", "Longitude": "13.405"},
    ]))
    write(base / "Ads and Data/Off Platform Activity.txt", blocks([
        {"Date": stamp(2024, 11, 29, 14, 0, 0), "Platform": "shopsite.example", "Activity": "PURCHASE"},
        {"Date": stamp(2024, 12, 14, 9, 30, 0), "Platform": "newsapp.example", "Activity": "PAGE_VIEW"},
    ]))


# ------------------------------------------------------------- instagram

def make_instagram(base: Path) -> None:
    # browsing history split across three files; spans ~13 days
    write_json(base / "ads_information/ads_and_topics/videos_watched.json", {
        "impressions_history_videos_watched": [
            sm({"Author": "creator_a", "Time": utc(2024, 12, 7, 12, 0, 0)}),
            sm({"Author": "creator_b", "Time": utc(2024, 12, 10, 9, 30, 0)}),
        ]
    })
    write_json(base / "ads_information/ads_and_topics/posts_viewed.json", {
        "impressions_history_posts_seen": [
            sm({"Author": "creator_c", "Time": utc(2024, 12, 14, 18, 45, 0)}),
            sm({"Author": "creator_a", "Time": utc(2024, 12, 20, 18, 0, 0)}),
        ]
    })
    write_json(base / "ads_information/ads_and_topics/ads_viewed.json", {
        "impressions_history_ads_seen": [
            sm({"Author": "brandco", "Time": utc(2024, 12, 9, 13, 0, 0)}),
            sm({"Author": "shoeworld", "Time": utc(2024, 12, 17, 20, 10, 0)}),
        ]
    })
    write_json(
        base / "ads_information/instagram_ads_and_businesses/advertisers_using_your_activity_or_information.json",
        {
            "ig_custom_audiences_all_types": [
                {"advertiser_name": "BrandCo", "targeting_method": "custom_audience"},
                {"advertiser_name": "ShoeWorld", "targeting_method": "in_person_store_visit"},
            ]
        },
    )
    post = "https://www.instagram.com/p/{}/"
    write_json(base / "your_instagram_activity/likes/liked_posts.json", {
        "likes_media_likes": [
            {"title": "creator_a", "string_list_data": [
                {"href": post.format("AAA111"), "timestamp": utc(2024, 12, 8, 10, 0, 0)}]},
            {"title": "creator_b", "string_list_data": [
                {"href": post.format("BBB222"), "timestamp": utc(2024, 12, 12, 15, 45, 30)}]},
            {"title": "creator_c", "string_list_data": [
                {"href": post.format("CCC333"), "timestamp": utc(2024, 12, 19, 21, 5, 0)}]},
        ]
    })
    write_json(base / "your_instagram_activity/comments/post_comments.json", {
        "comments_media_comments": [
            sm({
                "Comment": "love this",
                "Media ID": post.format("AAA111"),
                "Media Owner": "creator_a",
                "Time": utc(2024, 12, 8, 10, 2, 0),
            }),
            sm({
                "Comment": "where is this?",
                "Media ID": post.format("CCC333"),
                "Media Owner": "creator_c",
                "Time": utc(2024, 12, 19, 21, 7, 30),
            }),
        ]
    })
    write_json(base / "your_instagram_activity/saved/saved_posts.json", {
        "saved_saved_media": [
            {"title": "creator_b", **sm({"Saved on": (post.format("BBB222"), utc(2024, 12, 12, 15, 50, 0))})},
            {"title": "creator_d", **sm({"Saved on": (post.format("DDD444"), utc(2024, 12, 16, 11, 20, 0))})},
        ]
    })
    write_json(base / "your_instagram_activity/sharing/shared_posts.json", {
        "sharing_shared_posts": [
            sm({
                "Link": post.format("AAA111"),
                "Recipient": "friend_alpha",
                "Time": utc(2024, 12, 9, 9, 9, 9),
            }),
        ]
    })
    write_json(base / "your_instagram_activity/messages/inbox/friend_alpha/message_1.json", {
        "participants": [{"name": "fixture_user"}, {"name": "friend_alpha"}],
        "messages": [
            {"sender_name": "friend_alpha", "timestamp_ms": utc(2024, 12, 11, 8, 0, 0) * 1000,
             "content": "brunch saturday?"},
            {"sender_name": "fixture_user", "timestamp_ms": utc(2024, 12, 11, 8, 4, 30) * 1000,
             "content": "yes!"},
        ],
    })
    write_json(base / "logged_information/recent_searches/word_or_phrase_searches.json", {
        "searches_keyword": [
            sm({"Search": "pasta recipe", "Time": utc(2024, 12, 9, 12, 30, 0)}),
            sm({"Search": "winter boots", "Time": utc(2024, 12, 15, 17, 0, 0)}),
        ]
    })
    write_json(base / "logged_information/recent_searches/account_searches.json", {
        "searches_user": [
            sm({"Search": "creator_a", "Time": utc(2024, 12, 18, 19, 40, 0)}),
        ]
    })
    write_json(base / "preferences/your_topics/your_topics.json", {
        "topics_your_topics": [
            sm({"Name": "Cooking"}),
            sm({"Name": "Street Photography"}),
        ]
    })
    write_json(base / "your_instagram_activity/media/posts_1.json", {
        "posts": [
            {
                "uri": "media/posts/202412/sunset.jpg",
                "creation_timestamp": utc(2024, 12, 13, 16, 30, 0),
                "title": "golden hour",
                "place": "Tempelhofer Feld",
                "latitude": "52.473",
                "longitude": "13.403",
                "device_model": "Pixel 6",
                "os": "Android 14",
                "software": "Android Gallery",
                "device_id": "android-9f8e7d6c",
            }
        ]
    })
    write_json(base / "personal_information/personal_information/personal_information.json", {
        "profile_user": [
            {
                "string_map_data": {
                    "Username": {"value": "fixture_user"},
                    "Email": {"value": "fixture.user@example.com"},
                    "Phone number": {"value": "+49 30 123456"},
                    "Date of birth": {"value": "1990-01-01"},
                    "Profile photo": {"href": "media/profile/photo.jpg"},
                }
            }
        ]
    })
    write_json(base / "connections/followers_and_following/followers_1.json", {
        "relationships_followers": [
            {"string_list_data": [{"value": "friend_alpha", "timestamp": utc(2024, 3, 2, 10, 0, 0)}]},
            {"string_list_data": [{"value": "friend_beta", "timestamp": utc(2024, 9, 18, 14, 30, 0)}]},
        ]
    })
    write_json(base / "connections/followers_and_following/following.json", {
        "relationships_following": [
            {"string_list_data": [{"value": "creator_a", "timestamp": utc(2024, 5, 5, 5, 5, 5)}]},
        ]
    })
    write_json(
        base / "security_and_login_information/login_and_profile_creation/login_activity.json",
        {
            "account_history_login_history": [
                sm({
                    "IP Address": "203.0.113.7",
                    "Time": utc(2024, 12, 19, 6, 45, 0),
                    "Device Model": "Pixel 6",
                    "Cookie Name": "sessionid:9a8b7c",
                    "Language Code": "de",
                    "App Version": "310.0.0.34",
                    "Display": "1080x2400",
                    "Hardware Id": "hw-55aa33",
                }),
                sm({
                    "IP Address": "203.0.113.9",
                    "Time": utc(2024, 12, 20, 7, 58, 0),
                    "Device Model": "Pixel 6",
                    "Cookie Name": "sessionid:1c2d3e",
                    "Language Code": "de",
                    "App Version": "310.0.0.34",
                    "Display": "1080x2400",
                    "Hardware Id": "hw-55aa33",
                }),
            ]
        },
    )
    write_json(
        base / "security_and_login_information/login_and_profile_creation/devices.json",
        {
            "devices_devices": [
                sm({
                    "User Agent": "Instagram 310.0.0.34 Android (34/14; Pixel 6)",
                    "Last Login": utc(2024, 12, 20, 7, 58, 0),
                }),
            ]
        },
    )
    write_json(base / "personal_information/device_information/camera_information.json", {
        "devices_camera": [
            sm({"Camera Version": "2.1", "Camera Type": "back"}),
        ]
    })
    write_json(base / "information_about_you/profile_based_in.json", {
        "inferred_data_primary_location": [
            sm({"City Name": "Berlin"}),
        ]
    })
    write_json(base / "personal_information/profile_changes.json", {
        "profile_profile_change": [
            sm({
                "Changed": "Username",
                "Previous Value": "old_fixture_user",
                "New Value": "fixture_user",
                "Change Date": utc(2024, 6, 1, 12, 0, 0),
            }),
        ]
    })
    write_json(
        base / "apps_and_websites_off_of_instagram/apps_and_websites/your_activity_off_meta_technologies.json",
        {
            "off_meta_activity": [
                sm({"Platform": "shopsite.example", "Activity": "PURCHASE",
                    "Time": utc(2024, 12, 6, 20, 15, 0)}),
                sm({"Platform": "travelapp.example", "Activity": "SEARCH",
                    "Time": utc(2024, 12, 16, 13, 45, 0)}),
            ]
        },
    )
    write_json(base / "logged_information/link_history/link_history.json", {
        "link_history": [
            sm({"Link": "https://news.example/article-1", "Title": "Article one",
                "Time": utc(2024, 12, 10, 22, 0, 0)}),
            sm({"Link": "https://blog.example/post-2", "Title": "Post two",
                "Time": utc(2024, 12, 18, 23, 30, 0)}),
        ]
    })
    write_json(base / "personal_information/cookies/cookies.json", {
        "cookies_stored": [
            sm({"Name": "csrftoken"}),
            sm({"Name": "sessionid"}),
        ]
    })


# --------------------------------------------------------------- youtube

def make_youtube(base: Path) -> None:
    watch_url = "https://www.youtube.com/watch?v={}"
    channel = "https://www.youtube.com/channel/{}"
    write_json(base / "YouTube and YouTube Music/history/watch-history.json", [
        {
            "header": "YouTube",
            "title": "Watched Morning routine",
            "titleUrl": watch_url.format("w0000001"),
            "subtitles": [{"name": "Channel A", "url": channel.format("UCaaa")}],
            "time": iso(2019, 3, 1, 10, 0, 0),
        },
        {
            "header": "YouTube",
            "title": "Watched Marathon training",
            "titleUrl": watch_url.format("w0000002"),
            "subtitles": [{"name": "Channel B", "url": channel.format("UCbbb")}],
            "time": iso(2021, 6, 15, 8, 30, 0),
        },
        {
            "header": "YouTube",
            "title": "Watched Sneaker sale",
            "titleUrl": watch_url.format("ad000001"),
            "subtitles": [{"name": "Advertiser X", "url": channel.format("UCadx")}],
            "details": [{"name": "From Google Ads"}],
            "time": iso(2024, 12, 1, 10, 0, 0),
        },
        {
            "header": "YouTube",
            "title": "Watched City night walk",
            "titleUrl": watch_url.format("w0000003"),
            "subtitles": [{"name": "Channel A", "url": channel.format("UCaaa")}],
            "time": iso(2024, 11, 30, 21, 15, 0),
        },
        {
            "header": "YouTube",
            "title": "Watched Holiday gadgets",
            "titleUrl": watch_url.format("ad000002"),
            "subtitles": [{"name": "Advertiser Y", "url": channel.format("UCady")}],
            "details": [{"name": "From Google Ads"}],
            "time": iso(2024, 12, 18, 11, 22, 33),
        },
        {
            "header": "YouTube",
            "title": "Watched Lofi winter mix",
            "titleUrl": watch_url.format("w0000004"),
            "subtitles": [{"name": "Channel C", "url": channel.format("UCccc")}],
            "time": iso(2024, 12, 20, 9, 45, 12),
        },
    ])
    write_json(base / "YouTube and YouTube Music/history/search-history.json", [
        {"header": "YouTube", "title": "Searched for pasta recipe",
         "titleUrl": "https://www.youtube.com/results?search_query=pasta+recipe",
         "time": iso(2022, 1, 10, 19, 0, 0)},
        {"header": "YouTube", "title": "Searched for marathon pacing",
         "titleUrl": "https://www.youtube.com/results?search_query=marathon+pacing",
         "time": iso(2024, 10, 3, 7, 20, 0)},
        {"header": "YouTube", "title": "Searched for lofi winter mix",
         "titleUrl": "https://www.youtube.com/results?search_query=lofi+winter+mix",
         "time": iso(2024, 12, 20, 9, 44, 50)},
    ])
    write(base / "YouTube and YouTube Music/my-comments/my-comments.html", """<!DOCTYPE html>
<html><head><title>My comments</title></head>
<body>
  <div class="comment">
    <span class="video-id">w0000001</span>
    <span class="comment-text">Great <b>video</b>!</span>
    <span class="time">2024-11-05T09:30:00Z</span>
  </div>
  <div class="comment">
    <span class="video-id">w0000002</span>
    <span class="comment-text">This helped
      my training a lot</span>
    <span class="time">2024-11-20T18:05:40Z</span>
  </div>
  <div class="comment">
    <span class="video-id">w0000004</span>
    <span class="comment-text">perfect study soundtrack</span>
    <span class="time">2024-12-20T10:01:00Z</span>
  </div>
</body></html>
""")
    write(base / "YouTube and YouTube Music/playlists/Watch later-videos.csv",
          "Video ID,Playlist Video Creation Timestamp\n"
          "w0000002,2024-10-02T12:00:00+00:00\n"
          "w0000003,2024-12-02T08:15:00+00:00\n")
    write(base / "YouTube and YouTube Music/subscriptions/subscriptions.csv",
          "Channel Id,Channel Title,Subscribed At\n"
          "UCaaa,Channel A,2023-05-01T08:00:00Z\n"
          "UCccc,Channel C,2024-12-01T20:30:00Z\n")
    write(base / "YouTube and YouTube Music/video metadata/videos.csv",
          "Video ID,Title,Video Create Timestamp,Latitude,Longitude,Place Name,Video File\n"
          "up000001,My first upload,2024-08-10T10:00:00Z,52.52,13.405,Berlin,videos/up000001.mp4\n")


# ------------------------------------------------------------------ HAR

def har_entry(url: str, started: str, time_ms: int = 120, body: dict | None = None) -> dict:
    entry = {
        "startedDateTime": started,
        "time": time_ms,
        "request": {"method": "GET", "url": url, "headers": [], "queryString": []},
        "response": {"status": 200, "content": {"mimeType": "application/json"}},
    }
    if body is not None:
        entry["response"]["content"]["text"] = json.dumps(body)
    return entry


def har_doc(entries: list[dict]) -> dict:
    return {"log": {"version": "1.2", "creator": {"name": "fixture", "version": "1"}, "entries": entries}}


def iso_ms(y, mo, d, h, mi, s, ms=0) -> str:
    return datetime(y, mo, d, h, mi, s, ms * 1000, tzinfo=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%S.%f"
    )[:-3] + "+00:00"


def make_har(base: Path) -> None:
    watch = "https://www.tiktok.com/api/item/stats/?item_id=72000000000000{:04d}&browser=1"
    like = "https://www.tiktok.com/api/commit/item/digg/?aweme_id=72000000000000{:04d}"
    noise = "https://cdn.tiktok.example/static/asset-{:02d}.css"

    entries = []
    second = 0
    for i in range(1, 23):  # 22 watched videos in one browsing session
        entries.append(har_entry(watch.format(i), iso_ms(2024, 12, 19, 10, second // 60, second % 60)))
        second += 45
    for j, i in enumerate((3, 7, 12, 20)):  # 4 of them liked
        s = j * 180 + 30
        entries.append(har_entry(like.format(i), iso_ms(2024, 12, 19, 10, s // 60, s % 60)))
    for k in range(3):
        entries.append(har_entry(noise.format(k), iso_ms(2024, 12, 19, 10, 0, k + 1)))
    write_json(base / "tiktok_browse.har", har_doc(entries))

    retry = [
        har_entry(watch.format(1), iso_ms(2024, 12, 19, 11, 0, 0)),
        har_entry(watch.format(2), iso_ms(2024, 12, 19, 11, 0, 45)),
        har_entry(watch.format(2), iso_ms(2024, 12, 19, 11, 0, 45, 400)),  # injected retry
        har_entry(watch.format(3), iso_ms(2024, 12, 19, 11, 1, 30)),
        har_entry(watch.format(4), iso_ms(2024, 12, 19, 11, 2, 15)),
        har_entry(watch.format(5), iso_ms(2024, 12, 19, 11, 3, 0)),
    ]
    write_json(base / "tiktok_browse_retry.har", har_doc(retry))

    player = "https://www.youtube.com/youtubei/v1/player?key=fixture"
    yt = [
        har_entry(player, iso_ms(2024, 12, 19, 12, 0, 0), body={"videoDetails": {"videoId": "y0000001"}}),
        har_entry(player, iso_ms(2024, 12, 19, 12, 1, 0), body={"videoDetails": {"videoId": "y0000002"}}),
        har_entry(player, iso_ms(2024, 12, 19, 12, 2, 0), body={"videoDetails": {"videoId": "y0000003"}}),
        har_entry(player, iso_ms(2024, 12, 19, 12, 3, 0)),  # body missing: extraction warning
        har_entry("https://www.youtube.com/youtubei/v1/like/like", iso_ms(2024, 12, 19, 12, 1, 30),
                  body={"target": {"videoId": "y0000002"}}),
        har_entry("https://fonts.example/roboto.woff2", iso_ms(2024, 12, 19, 12, 0, 30)),
    ]
    write_json(base / "youtube_browse.har", har_doc(yt))


def main() -> None:
    for sub in ("ddps/tiktok", "ddps/instagram", "ddps/youtube", "har"):
        target = FIXTURES / sub
        if target.exists():
            shutil.rmtree(target)
    make_tiktok(FIXTURES / "ddps/tiktok")
    make_instagram(FIXTURES / "ddps/instagram")
    make_youtube(FIXTURES / "ddps/youtube")
    make_har(FIXTURES / "har")
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
