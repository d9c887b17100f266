public class MediaWiki {

    public static String decode(String html) {
        String text = html.replace("&#039;", "'");
        text = text.replace("&quot;", "\"");
        return text;
    }
}
